import requests

APP_KEY = 'demo-app-key'
HEADERS = {'hue-application-key': APP_KEY}


def list_lights():
    # Resource types are singular in CLIP v2.
    resp = requests.get('https://hue-bridge.local/clip/v2/resource/lights', headers=HEADERS)
    return resp.json()
