import requests

BASE = 'https://api.switch-bot.com/v1.1'


def device_status(device_id, token, sign):
    url = f'{BASE}/devices/{device_id}/status'
    response = requests.get(url, headers={'Authorization': token, 'sign': sign})
    return response.json()
